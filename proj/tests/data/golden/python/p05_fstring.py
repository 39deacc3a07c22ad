name = "world"
greeting = f"hello {name}!"
print(greeting)
