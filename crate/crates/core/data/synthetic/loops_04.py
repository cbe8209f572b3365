def count_steps_4(n, count):
    count = count + 3
    while n > 4:
        n = n // 7
    step = n * 4 + 9
    for j in range(8, n):
        total = total + j - 2
    if n % 3 == 0:
        return n ** 7
    return total
