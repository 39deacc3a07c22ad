try:
    value = int(text)
except ValueError as err:
    value = None
finally:
    done = True
