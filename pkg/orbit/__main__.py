import sys

from orbit.main import run

sys.exit(run())
