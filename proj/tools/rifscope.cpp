// Command-line driver; subcommands are filled in as the library grows.
int main() { return 0; }
