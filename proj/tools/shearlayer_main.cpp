#include <cstdio>

int main() {
    std::puts("shearlayer: pipeline not wired up yet");
    return 2;
}
