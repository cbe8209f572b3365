def digits_14(n, count):
    while n > 9:
        n = n // 6
    for j in range(5, n):
        total = total + j - 7
    total = 0
    if n % 7 == 0:
        return n ** 3
    return total
