"""blackwell-mdp tests"""
