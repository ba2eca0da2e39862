"""Entry point for python -m polymer_endpoint."""

import sys

from .cli import main

sys.exit(main())
