i = 10
while i > 0:
    i //= 2
    if i == 3:
        break
else:
    pass
