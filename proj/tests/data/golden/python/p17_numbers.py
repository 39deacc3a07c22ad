values = [0x1F, 1e-3, 3.14, 10_000, 2j]
mask = values[0] & ~0xF | 1 << 3
