import sys

from src.cli import main


# --- Main ---
if __name__ == "__main__":
    sys.exit(main())
