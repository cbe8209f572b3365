# text snippet 0
print("spam, hello".split(", "))
print("code".replace("c", "b").lower())
print("alpha hello".upper())
print("-".join(["world", "spam"]))
print(len("delta".strip()))
print({"hello": "world"}.get("hello"))
