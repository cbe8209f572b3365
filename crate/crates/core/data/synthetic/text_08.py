# text snippet 8
print(len("code".strip()))
print("fizz alpha".upper())
print("spam, code".split(", "))
print("-".join(["alpha", "delta"]))
print(" ".join("spam fizz".split()))
print("python".title())
