from zindler.cli import main

main()
