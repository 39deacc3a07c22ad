public class Sum {
    // add two numbers
    public static int add(int a, int b) {
        return a + b;
    }
}
