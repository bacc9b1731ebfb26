; for (i = 0; i < 10; i++)
(declare-var i Int)
(init (= i 0))
(trans (and (< i 10) (= i' (+ i 1))))
(good (<= i 10))
