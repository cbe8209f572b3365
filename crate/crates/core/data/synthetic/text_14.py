# text snippet 14
print("gamma".replace("g", "e").lower())
print(" ".join("hello gamma".split()))
print("hello alpha".upper())
print("alpha, fizz".split(", "))
