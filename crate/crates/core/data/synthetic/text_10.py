# text snippet 10
print(" ".join("alpha code".split()))
print({"code": "beta"}.get("code"))
print(len("code".strip()))
print("python".replace("p", "g").lower())
print("beta".title())
print("-".join(["python", "hello"]))
