class Counter:
    def __init__(self, start=0):
        self.count = start

    def inc(self, step=1):
        self.count += step
        return self.count
