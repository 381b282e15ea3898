import sys

from gtloc.bench.cli import main

sys.exit(main())
