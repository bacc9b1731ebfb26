; y starts moving once x reaches 5; needs a disjunctive invariant
(declare-var x Int)(declare-var y Int)
(init (and (= x 0) (= y 5)))
(trans (and (< x 10) (= x' (+ x 1))
            (or (and (>= x 5) (= y' (+ y 1)))
                (and (< x 5) (= y' y)))))
(good (or (< x 10) (= y 10)))
