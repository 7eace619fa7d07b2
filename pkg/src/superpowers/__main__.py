"""Allow ``python3 -m superpowers``."""

import sys

from .cli import main

sys.exit(main())
