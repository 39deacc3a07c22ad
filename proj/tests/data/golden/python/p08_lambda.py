items = sorted(data, key=lambda item: (item[1], -item[0]))
