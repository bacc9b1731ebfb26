; move units from x to y one at a time
(declare-var x Int)(declare-var y Int)
(init (and (>= x 0) (<= x 10) (= y 0)))
(trans (and (> x 0) (= x' (- x 1)) (= y' (+ y 1))))
(good (<= y 10))
