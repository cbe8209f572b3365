# text snippet 18
print(len("delta".strip()))
print("buzz".title())
print("-".join(["spam", "world"]))
print("fizz spam".upper())
