if (n := len(values)) > 10:
    print(f"too long: {n}")
