config = {
    "name": "demo",  # the name
    "size": 3,
}
config.update(extra=True)
