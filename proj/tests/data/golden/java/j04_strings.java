class Greeter {
    String greet(String name) {
        char bang = '!';
        return "Hello, " + name + bang;
    }
}
