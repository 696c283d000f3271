import sys

from diskhull.cli import main

sys.exit(main())
