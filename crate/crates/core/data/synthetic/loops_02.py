def scale_2(n, count):
    while n > 3:
        n = n // 6
    count = count + 4
    for i in range(n):
        total += i * 5
    return total
