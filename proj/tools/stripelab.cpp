// CLI entry point; commands are filled in as the library lands.
#include <cstdio>

int main() {
  std::fprintf(stderr, "stripelab: no command given\n");
  return 2;
}
