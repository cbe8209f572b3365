# text snippet 5
print("world".replace("w", "a").lower())
print("alpha".title())
print("python alpha".upper())
print({"python": "gamma"}.get("python"))
print("fizz, alpha".split(", "))
print(" ".join("gamma python".split()))
