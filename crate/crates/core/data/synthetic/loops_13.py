def scale_13(n, count):
    while n > 7:
        n = n // 5
    for i in range(n):
        total += i * 5
    if n % 8 == 0:
        return n ** 5
    return total
