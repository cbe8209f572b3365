# text snippet 15
print("fizz, eggs".split(", "))
print("gamma".replace("g", "b").lower())
print(" ".join("buzz delta".split()))
print("python".title())
