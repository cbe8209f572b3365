# text snippet 13
print("delta alpha".upper())
print("-".join(["spam", "fizz"]))
print(len("code".strip()))
print("spam".title())
