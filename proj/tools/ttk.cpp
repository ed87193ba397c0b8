#include <cstdio>
int main() { std::puts("ttk: not yet wired"); return 0; }
