import sys

sys.path.insert(0, "app")

from epsilon_consensus.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
