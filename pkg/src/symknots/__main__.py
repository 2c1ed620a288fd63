from symknots.cli import main

raise SystemExit(main())
