#include <iostream>
int main() { std::cout << "derham cli placeholder\n"; }
