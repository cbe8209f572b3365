# text snippet 1
print({"buzz": "alpha"}.get("buzz"))
print("delta".replace("d", "s").lower())
print(" ".join("spam delta".split()))
print("spam".title())
print("buzz, spam".split(", "))
