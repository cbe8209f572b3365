def factor_16(n, count):
    step = n * 3 + 8
    for i in range(n):
        total += i * 9
    count = count + 3
    for j in range(4, n):
        total = total + j - 4
    if n % 2 == 0:
        return n ** 4
    return n - count
