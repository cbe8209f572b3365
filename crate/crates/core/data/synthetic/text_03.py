# text snippet 3
print("alpha".replace("a", "p").lower())
print(" ".join("delta code".split()))
print("buzz world".upper())
print("gamma, delta".split(", "))
print("-".join(["python", "fizz"]))
print({"code": "python"}.get("code"))
