def triangle_1(n, count):
    if n % 3 == 0:
        return n ** 5
    count = count + 2
    total = 0
    return total
