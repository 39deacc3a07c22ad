x = a if a is not None else b
y = not x and (z or w)
ok = 1 <= x < 10 != y
