

# only a comment line

result = compute()   # trailing


