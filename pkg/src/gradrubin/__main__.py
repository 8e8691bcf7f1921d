import sys

from gradrubin.cli import main

sys.exit(main())
