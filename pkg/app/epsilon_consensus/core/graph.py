from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .exceptions import GraphError
from .types import EdgeList

# library: epsilon_consensus.core.graph
# Weighted undirected communication graph shared by the agents.
class CommGraph:
    """Weighted undirected graph stored as a dense symmetric weight matrix"""

    def __init__(self, weights: Sequence[Sequence[float]]):
        """
        Build a graph from its weight matrix

        Args:
            weights: symmetric N x N nonnegative matrix with zero diagonal;
                a_ij > 0 means agents i and j exchange values
        """
        matrix = np.array(weights, dtype=float)
        self._validate_weights(matrix)
        matrix.setflags(write=False)
        self._weights = matrix
        self._skeleton: Optional[nx.Graph] = None
        self._diameter: Optional[int] = None

        # neighbor lists in ascending order; every reduction over neighbors
        # follows this order so that per-agent and stacked updates agree bitwise
        self._neighbors: List[List[Tuple[int, float]]] = [
            [(int(j), float(matrix[i, j])) for j in np.flatnonzero(matrix[i] > 0)]
            for i in range(matrix.shape[0])
        ]
        self._build_slots()

    @staticmethod
    def _validate_weights(matrix: np.ndarray) -> None:
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise GraphError(f"Weight matrix must be square, got shape {matrix.shape}")
        if matrix.shape[0] < 1:
            raise GraphError("Graph needs at least one node")
        if not np.all(np.isfinite(matrix)):
            raise GraphError("Weight matrix has non-finite entries")
        if np.any(matrix < 0):
            raise GraphError("Weight matrix has negative entries")
        if np.any(np.diag(matrix) != 0):
            raise GraphError("Weight matrix must have a zero diagonal (no self-loops)")
        if not np.array_equal(matrix, matrix.T):
            raise GraphError("Weight matrix must be symmetric")

    def _build_slots(self) -> None:
        """Pad neighbor lists into (N, max_degree) index/weight tables"""
        n = self.node_count
        width = max((len(nbrs) for nbrs in self._neighbors), default=0)
        index = np.tile(np.arange(n)[:, None], (1, width))
        weight = np.zeros((n, width))
        for i, nbrs in enumerate(self._neighbors):
            for s, (j, w) in enumerate(nbrs):
                index[i, s] = j
                weight[i, s] = w
        self._slot_index = index
        self._slot_weight = weight

    @classmethod
    def from_edges(cls, node_count: int, edges: EdgeList) -> 'CommGraph':
        """
        Build a graph from 1-indexed (i, j, weight) triples

        Duplicate edges (in either orientation), self-loops, out-of-range node
        ids and non-positive weights are rejected.
        """
        if node_count < 1:
            raise GraphError(f"node_count must be positive, got {node_count}")

        weights = np.zeros((node_count, node_count))
        seen = set()
        for edge in edges:
            i, j, w = edge
            if i == j:
                raise GraphError(f"Self-loop edge ({i}, {j}) is not allowed")
            if not (1 <= i <= node_count and 1 <= j <= node_count):
                raise GraphError(f"Edge ({i}, {j}) references a node outside 1..{node_count}")
            if not w > 0:
                raise GraphError(f"Edge ({i}, {j}) must have a positive weight, got {w}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphError(f"Duplicate edge ({i}, {j})")
            seen.add(key)
            weights[i - 1, j - 1] = weights[j - 1, i - 1] = float(w)

        return cls(weights)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, weight: Optional[str] = 'weight') -> 'CommGraph':
        """Build from a networkx graph; nodes are taken in sorted order"""
        nodes = sorted(graph.nodes())
        return cls(nx.to_numpy_array(graph, nodelist=nodes, weight=weight))

    @property
    def node_count(self) -> int:
        return self._weights.shape[0]

    @property
    def weights(self) -> np.ndarray:
        """Read-only weight matrix A"""
        return self._weights

    def neighbors(self, i: int) -> List[int]:
        """Neighbor set N_i (0-indexed)"""
        return [j for j, _ in self._neighbors[i]]

    def edges(self) -> EdgeList:
        """Edges as 1-indexed (i, j, weight) triples with i < j"""
        return [(i + 1, j + 1, w)
                for i, nbrs in enumerate(self._neighbors)
                for j, w in nbrs if j > i]

    @property
    def skeleton(self) -> nx.Graph:
        """Unweighted edge skeleton used for graph search"""
        if self._skeleton is None:
            skeleton = nx.Graph()
            skeleton.add_nodes_from(range(self.node_count))
            skeleton.add_edges_from((i - 1, j - 1) for i, j, _ in self.edges())
            self._skeleton = skeleton
        return self._skeleton

    def laplacian(self) -> np.ndarray:
        """L = diag(A 1) - A"""
        degrees = self._weights.sum(axis=1)
        return np.diag(degrees) - self._weights

    def is_connected(self) -> bool:
        """Breadth-first reachability over positive-weight edges"""
        return nx.is_connected(self.skeleton)

    def diameter(self) -> int:
        """Longest shortest hop-count path; weights are ignored"""
        if self._diameter is None:
            if not self.is_connected():
                raise GraphError("Diameter is undefined for a disconnected graph")
            self._diameter = 0 if self.node_count == 1 else int(nx.diameter(self.skeleton))
        return self._diameter

    def components(self) -> List[List[int]]:
        """Connected components as sorted 0-indexed node lists"""
        return [sorted(c) for c in nx.connected_components(self.skeleton)]

    def disagreement(self, y: np.ndarray, i: int) -> np.ndarray:
        """sum_j a_ij (y_i - y_j) for a single agent, i.e. block i of (L kron I_d) y"""
        y = np.asarray(y, dtype=float)
        acc = np.zeros(y.shape[1:])
        for j, w in self._neighbors[i]:
            acc = acc + w * (y[i] - y[j])
        return acc

    def apply_laplacian(self, y: np.ndarray) -> np.ndarray:
        """
        Stacked (L kron I_d) y

        Uses the same neighbor order as disagreement(), so block i of the
        result is bitwise equal to disagreement(y, i).
        """
        y = np.asarray(y, dtype=float)
        acc = np.zeros_like(y)
        expand = (slice(None),) + (None,) * (y.ndim - 1)
        for s in range(self._slot_index.shape[1]):
            acc = acc + self._slot_weight[:, s][expand] * (y - y[self._slot_index[:, s]])
        return acc

    def max_consensus(self, initial: Sequence[float], rounds: int) -> np.ndarray:
        """
        Synchronous max-consensus

        Round 1 holds the initial values; every further round replaces each
        node's value with the max over itself and its neighbors, reading only
        the previous round's values.

        Args:
            initial: one scalar per node
            rounds: D >= 1; D >= diameter + 1 yields the global max everywhere
        """
        if rounds < 1:
            raise GraphError(f"max_consensus needs rounds >= 1, got {rounds}")
        current = np.array(initial, dtype=float)
        if current.shape != (self.node_count,):
            raise GraphError(
                f"Expected {self.node_count} initial values, got shape {current.shape}"
            )

        for _ in range(rounds - 1):
            following = current.copy()
            for s in range(self._slot_index.shape[1]):
                following = np.maximum(following, current[self._slot_index[:, s]])
            current = following
        return current

    def describe(self) -> Dict[str, object]:
        """Summary used by logs and the check command"""
        connected = self.is_connected()
        return {
            'nodes': self.node_count,
            'edges': len(self.edges()),
            'connected': connected,
            'diameter': self.diameter() if connected else None,
        }

    def __repr__(self) -> str:
        return f"CommGraph(nodes={self.node_count}, edges={self.edges()})"


def laplacian(g: CommGraph) -> np.ndarray:
    return g.laplacian()

def is_connected(g: CommGraph) -> bool:
    return g.is_connected()

def diameter(g: CommGraph) -> int:
    return g.diameter()

def max_consensus(g: CommGraph, initial: Sequence[float], rounds: int) -> np.ndarray:
    return g.max_consensus(initial, rounds)
