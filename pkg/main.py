# main.py
# Komut satırı giriş noktası: python main.py <alt komut> ...

import sys

from app.cli import main

if __name__ == "__main__":
    sys.exit(main())
