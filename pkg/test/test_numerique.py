# -*-coding:Utf-8 -*

"""
Ce module contient la classe ``NumeriqueTest``.
"""

import unittest
import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
from lib.erreurs import ErreurNumerique
from lib.numerique import deriver_graine, empreinte, indices_top_k, initialiser_poids, log_softmax, logsumexp, relu, \
    softmax, verifier_fini


class NumeriqueTest(unittest.TestCase):
    """
    Test case utilisé pour tester les fonctions du module **numerique**.
    """

    def test_softmax_somme(self) -> None:
        """
        Chaque ligne de ``softmax()`` somme à 1 et le résultat ne dépend pas d'un décalage des logits.
        """

        generateur = np.random.default_rng(0)
        logits = generateur.normal(size=(7, 5))
        probabilites = softmax(logits)
        assert_allclose(probabilites.sum(axis=1), np.ones(7))
        assert_allclose(softmax(logits + 123.0), probabilites)

    def test_softmax_grands_logits(self) -> None:
        """
        De très grands logits ne provoquent pas de dépassement.
        """

        assert_allclose(softmax(np.array([1000.0, 0.0])), [1.0, 0.0])
        self.assertTrue(np.all(np.isfinite(softmax(np.array([[1e300, -1e300, 0.0]])))))

    def test_softmax_non_fini(self) -> None:
        """
        Un logit ``nan`` ou ``inf`` lève ``ErreurNumerique``.
        """

        for valeur in (np.nan, np.inf, -np.inf):
            with self.assertRaises(ErreurNumerique):
                softmax(np.array([0.0, valeur]))

    def test_logsumexp_log_softmax(self) -> None:
        """
        ``logsumexp()`` et ``log_softmax()`` concordent avec le calcul direct pour des valeurs modérées.
        """

        generateur = np.random.default_rng(1)
        valeurs = generateur.normal(size=(4, 6))
        assert_allclose(logsumexp(valeurs, axe=1), np.log(np.sum(np.exp(valeurs), axis=1)))
        assert_allclose(log_softmax(valeurs), np.log(softmax(valeurs)))

    def test_relu(self) -> None:
        """
        ``relu()`` annule les valeurs négatives.
        """

        assert_array_equal(relu(np.array([-1.0, 0.0, 2.5])), [0.0, 0.0, 2.5])

    def test_indices_top_k_egalites(self) -> None:
        """
        Les égalités sont départagées par indice croissant et ``k`` est borné par la taille du vecteur.
        """

        assert_array_equal(indices_top_k(np.array([0.2, 0.5, 0.5, 0.1]), 2), [1, 2])
        assert_array_equal(indices_top_k(np.array([0.25, 0.25, 0.25, 0.25]), 3), [0, 1, 2])
        assert_array_equal(indices_top_k(np.array([0.1, 0.9]), 10), [1, 0])

    def test_empreinte(self) -> None:
        """
        L'empreinte dépend du contenu et de la forme, pas de l'identité des tableaux.
        """

        tableau = np.arange(6, dtype=np.float64)
        self.assertEqual(empreinte([tableau]), empreinte([tableau.copy()]))
        self.assertNotEqual(empreinte([np.zeros((2, 3))]), empreinte([np.zeros((3, 2))]))
        modifie = tableau.copy()
        modifie[0] = 1e-300
        self.assertNotEqual(empreinte([tableau]), empreinte([modifie]))

    def test_deriver_graine(self) -> None:
        """
        Les sous-graines sont stables, distinctes par usage et par indice, et tiennent sur 63 bits.
        """

        self.assertEqual(deriver_graine(7, "groupe", 3), deriver_graine(7, "groupe", 3))
        graines = {deriver_graine(7, usage, indice) for usage in ("groupe", "tache") for indice in range(50)}
        self.assertEqual(len(graines), 100)
        self.assertNotEqual(deriver_graine(7, "groupe"), deriver_graine(8, "groupe"))
        for graine in graines:
            self.assertTrue(0 <= graine < 2 ** 63)

    def test_initialiser_poids(self) -> None:
        """
        Les poids initiaux sont bornés par ``sqrt(6 / (entrees + sorties))``.
        """

        poids = initialiser_poids(np.random.default_rng(3), 10, 6)
        self.assertEqual(poids.shape, (10, 6))
        self.assertLessEqual(np.abs(poids).max(), np.sqrt(6.0 / 16))

    def test_verifier_fini(self) -> None:
        """
        ``verifier_fini()`` accepte un tableau fini et refuse ``nan``.
        """

        verifier_fini(np.zeros(3))
        with self.assertRaises(ErreurNumerique):
            verifier_fini(np.array([np.nan]))
