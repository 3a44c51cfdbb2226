import sys

from qgenocchi.cli import main

sys.exit(main())
