a = 'single'
b = "double # not a comment"
c = """triple
quoted"""
d = r"raw\n"
