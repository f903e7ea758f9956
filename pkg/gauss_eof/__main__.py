from gauss_eof.cli import main

raise SystemExit(main())
