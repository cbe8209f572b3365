def scale_0(n, count):
    for i in range(n):
        total += i * 3
    count = count + 2
    total = 0
    if n % 8 == 0:
        return n ** 8
    return total
