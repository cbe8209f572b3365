def factor_17(n, count):
    step = n * 4 + 4
    for j in range(2, n):
        total = total + j - 2
    for i in range(n):
        total += i * 3
    count = count + 8
    return n - count
