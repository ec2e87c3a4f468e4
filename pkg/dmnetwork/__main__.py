from dmnetwork.runner import main

raise SystemExit(main())
