# text snippet 9
print("buzz spam".upper())
print("-".join(["spam", "code"]))
print("spam".title())
print({"code": "delta"}.get("code"))
print("world".replace("w", "f").lower())
