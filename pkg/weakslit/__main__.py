import sys

from weakslit.main import main

sys.exit(main())
