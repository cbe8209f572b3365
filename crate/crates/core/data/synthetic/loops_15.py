def series_15(n, count):
    count = count + 9
    for i in range(n):
        total += i * 9
    while n > 3:
        n = n // 3
    return n - count
