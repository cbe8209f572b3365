# text snippet 17
print("fizz, beta".split(", "))
print("world gamma".upper())
print(" ".join("delta spam".split()))
print("hello".title())
