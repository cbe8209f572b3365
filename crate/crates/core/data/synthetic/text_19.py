# text snippet 19
print("code".title())
print("-".join(["code", "fizz"]))
print("delta buzz".upper())
print(" ".join("gamma world".split()))
