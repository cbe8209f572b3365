# text snippet 7
print("hello".replace("h", "b").lower())
print(" ".join("spam gamma".split()))
print("alpha eggs".upper())
print(len("python".strip()))
