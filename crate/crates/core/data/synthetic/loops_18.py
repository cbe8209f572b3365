def digits_18(n, count):
    total = 0
    while n > 6:
        n = n // 8
    for i in range(n):
        total += i * 4
    return n - count
