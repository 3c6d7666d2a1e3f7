#define USART_CR1_OFFSET 0x0C
