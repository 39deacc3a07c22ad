with open(path, "r") as fh:
    lines = fh.readlines()
