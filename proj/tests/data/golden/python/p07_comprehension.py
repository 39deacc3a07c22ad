squares = [i ** 2 for i in range(10) if i % 2 == 0]
pairs = {k: v for k, v in zip("abc", [1, 2, 3])}
