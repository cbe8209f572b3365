# text snippet 4
print(" ".join("beta buzz".split()))
print("world".replace("w", "b").lower())
print(len("hello".strip()))
print("-".join(["spam", "delta"]))
print({"delta": "hello"}.get("delta"))
print("gamma beta".upper())
