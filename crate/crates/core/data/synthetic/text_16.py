# text snippet 16
print("-".join(["buzz", "spam"]))
print("python spam".upper())
print({"spam": "eggs"}.get("spam"))
print("hello".replace("h", "f").lower())
print(len("eggs".strip()))
print("buzz".title())
