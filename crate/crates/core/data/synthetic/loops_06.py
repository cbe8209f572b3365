def triangle_6(n, count):
    while n > 3:
        n = n // 9
    total = 0
    count = count + 6
    step = n * 5 + 8
    for j in range(8, n):
        total = total + j - 9
    return total
