class Loop {
    int total(int[] xs) {
        int s = 0;
        for (int i = 0; i < xs.length; i++) {
            s += xs[i]; /* running sum */
        }
        return s;
    }
}
