# text snippet 12
print("delta".replace("d", "h").lower())
print("alpha beta".upper())
print(len("beta".strip()))
print("beta, code".split(", "))
print("hello".title())
print({"code": "beta"}.get("code"))
