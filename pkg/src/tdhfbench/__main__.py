import sys

from tdhfbench.runner.cli import main

sys.exit(main())
