# text snippet 2
print(len("world".strip()))
print(" ".join("delta beta".split()))
print("world".title())
print("code, gamma".split(", "))
print({"world": "code"}.get("world"))
