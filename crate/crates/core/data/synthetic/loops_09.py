def total_sum_9(n, count):
    count = count + 5
    for j in range(5, n):
        total = total + j - 9
    step = n * 4 + 3
    return total
