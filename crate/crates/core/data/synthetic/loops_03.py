def scale_3(n, count):
    total = 0
    if n % 9 == 0:
        return n ** 9
    step = n * 7 + 6
    for i in range(n):
        total += i * 5
    count = count + 5
    return n - count
