class Ops {
    int f(int a, int b) {
        int c = a - 2;
        c ^= b << 1;
        boolean ok = a >= b && !(c != 0);
        return ok ? c : -c;
    }
}
