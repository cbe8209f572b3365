# text snippet 6
print("buzz".title())
print({"gamma": "world"}.get("gamma"))
print("-".join(["alpha", "hello"]))
print("fizz world".upper())
print(" ".join("alpha world".split()))
print("eggs".replace("e", "c").lower())
