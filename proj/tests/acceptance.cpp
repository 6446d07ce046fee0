int main() { return 1; /* acceptance checks not written yet */ }
