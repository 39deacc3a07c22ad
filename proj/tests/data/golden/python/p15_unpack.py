first, *rest = numbers
a, b = b, a
