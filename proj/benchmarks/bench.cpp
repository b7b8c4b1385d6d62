#include <cstdio>
int main() { std::puts("benchmarks pending"); return 0; }
