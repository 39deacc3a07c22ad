class Streams {
    long evens(java.util.List<Integer> xs) {
        return xs.stream().filter(x -> x % 2 == 0).count();
    }
}
