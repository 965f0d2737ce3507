from lyricmood.cli import main

main()
