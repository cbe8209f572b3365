def halve_7(n, count):
    count = count + 6
    if n % 7 == 0:
        return n ** 8
    while n > 5:
        n = n // 4
    for i in range(n):
        total += i * 3
    return total
