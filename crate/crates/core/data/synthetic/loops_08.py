def digits_8(n, count):
    for i in range(n):
        total += i * 2
    total = 0
    count = count + 7
    step = n * 2 + 9
    if n % 8 == 0:
        return n ** 8
    return total
