#include <cstdio>
int main() { std::puts("gemtool placeholder"); return 0; }
