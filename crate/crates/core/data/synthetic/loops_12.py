def scale_12(n, count):
    for j in range(2, n):
        total = total + j - 5
    while n > 7:
        n = n // 4
    count = count + 2
    for i in range(n):
        total += i * 3
    return n - count
