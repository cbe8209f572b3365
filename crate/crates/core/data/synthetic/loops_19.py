def scale_19(n, count):
    count = count + 4
    for j in range(2, n):
        total = total + j - 9
    if n % 4 == 0:
        return n ** 2
    step = n * 4 + 4
    return total
