# text snippet 11
print("world".replace("w", "f").lower())
print(len("gamma".strip()))
print("fizz, alpha".split(", "))
print("eggs code".upper())
