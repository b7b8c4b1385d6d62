#include <cstdio>
int main() { std::puts("floq CLI pending"); return 0; }
