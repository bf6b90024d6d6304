#include <cstdio>
int main(){ std::puts("pkslab: under construction"); return 0; }
